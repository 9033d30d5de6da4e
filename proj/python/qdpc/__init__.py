"""Density peak clustering with classical and simulated quantum query models."""

from ._core import (
    cluster,
    decide,
    fit_power_law,
    generate_gaussian_mixture,
    generate_uniform_ball,
    grover_probabilities,
    grover_success_probability,
    height_scaling,
    pca_project,
    qmf_minimum,
    quantum_decide,
    quantum_nearest_higher,
    standardize,
    toy_experiment,
)

__all__ = [
    "cluster",
    "decide",
    "fit_power_law",
    "generate_gaussian_mixture",
    "generate_uniform_ball",
    "grover_probabilities",
    "grover_success_probability",
    "height_scaling",
    "pca_project",
    "qmf_minimum",
    "quantum_decide",
    "quantum_nearest_higher",
    "standardize",
    "toy_experiment",
]

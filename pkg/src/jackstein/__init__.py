"""Exact Jack measure, its down-up Markov chains and Stein-method CLT checks."""
from .chains import (
    DistOverPartitions,
    TransitionMatrix,
    chain_step_distribution,
    jack_distribution,
    jack_measure,
    k_chain,
    l_chain,
    m_chain,
    t_chain_toy,
)
from .partitions import Partition, c_prime_product, c_product, enumerate_partitions, parse_partition
from .sampling import exchangeable_pair_sample, grow_sample, make_rng
from .stein import kolmogorov_distance, moments, stein_upper_bound, w_statistic
from .symfunc import ThetaTable, jack_theta_table
from .verify import run_suite

__version__ = "0.1.0"

__all__ = [
    "DistOverPartitions",
    "Partition",
    "ThetaTable",
    "TransitionMatrix",
    "c_prime_product",
    "c_product",
    "chain_step_distribution",
    "enumerate_partitions",
    "exchangeable_pair_sample",
    "grow_sample",
    "jack_distribution",
    "jack_measure",
    "jack_theta_table",
    "k_chain",
    "kolmogorov_distance",
    "l_chain",
    "m_chain",
    "make_rng",
    "moments",
    "parse_partition",
    "run_suite",
    "stein_upper_bound",
    "t_chain_toy",
    "w_statistic",
]

"""Welfare-optimal recommendation under noisy measurement of binary types."""

from .allocation import (
    AllocationRule,
    GroupUtilities,
    TieBreak,
    allocate,
    group_utilities,
    lower_bound_check,
    minority_share,
)
from .constructions import (
    extremal_share_experiment,
    perfect,
    posterior_to_experiment,
    symmetric_vertex_experiment,
    uninformative,
)
from .experiment import (
    AgentType,
    Content,
    Experiment,
    Involution,
    PosteriorDistribution,
    Prior,
    SignalSpace,
    induced_posterior_distribution,
    is_bayes_plausible,
    posterior,
    signal_probability,
)
from .gaussian import GaussianModel

__version__ = "0.1.0"

__all__ = [
    "AgentType",
    "AllocationRule",
    "Content",
    "Experiment",
    "GaussianModel",
    "GroupUtilities",
    "Involution",
    "PosteriorDistribution",
    "Prior",
    "SignalSpace",
    "TieBreak",
    "allocate",
    "extremal_share_experiment",
    "group_utilities",
    "induced_posterior_distribution",
    "is_bayes_plausible",
    "lower_bound_check",
    "minority_share",
    "perfect",
    "posterior",
    "posterior_to_experiment",
    "signal_probability",
    "symmetric_vertex_experiment",
    "uninformative",
]

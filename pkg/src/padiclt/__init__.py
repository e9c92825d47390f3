"""padiclt: a desk-scale p-adic workbench for Lubin-Tate formal groups,
division-algebra actions on the fundamental domain, and the associated
non-archimedean norm estimates."""

__version__ = "0.1.0"

from .padics import UnramContext, PadicScalar, make_context  # noqa: F401
from .divalg import DivElem, div_mul, div_inv, j_embed, nrd  # noqa: F401
from .domain import DomainFunc, Section, gamma_act, lie_act  # noqa: F401
from .experiments import ExperimentConfig, run, emit  # noqa: F401

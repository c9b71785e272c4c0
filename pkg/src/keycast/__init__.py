"""Multiple key-cast network codes over acyclic networks."""

from .field import GF2k, choose_field
from .graph import Instance, load_instance, make_instance, save_instance
from .lincode import LinearCode, export_code, import_code, verify_code
from .nonsecure import check_feasibility, construct
from .secure import check_conditions, construct_secure, vertex_coloring

__all__ = [
    "GF2k",
    "choose_field",
    "Instance",
    "load_instance",
    "make_instance",
    "save_instance",
    "LinearCode",
    "export_code",
    "import_code",
    "verify_code",
    "check_feasibility",
    "construct",
    "check_conditions",
    "construct_secure",
    "vertex_coloring",
]

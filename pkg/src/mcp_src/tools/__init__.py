from .bound_tools import register_bound_tools
from .oracle_tools import register_oracle_tools

__all__ = ["register_bound_tools", "register_oracle_tools"]

from .tools import register_bound_tools, register_oracle_tools

__all__ = ["register_bound_tools", "register_oracle_tools"]

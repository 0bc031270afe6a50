"""Allow `python -m recrange` to behave like the installed command."""

from .cli import entrypoint

entrypoint()

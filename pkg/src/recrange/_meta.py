"""Version constant, kept import-light for the CLI manifest."""

TOOL_VERSION = "0.1.0"

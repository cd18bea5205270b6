"""Core package for the Guarded Commands analysis workbench."""

"""Entry point for the Guarded Commands workbench."""
from gcl_workbench.__main__ import main

if __name__ == "__main__":
    main()

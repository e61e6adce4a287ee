from src.cli.io import EXIT_ERROR, EXIT_FAIL, EXIT_OK, EXIT_WARN, exit_code_for

__all__ = ["EXIT_ERROR", "EXIT_FAIL", "EXIT_OK", "EXIT_WARN", "exit_code_for"]

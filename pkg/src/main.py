from dotenv import load_dotenv

# Load environment variables FIRST so settings and LangSmith see them
load_dotenv()

import importlib  # noqa: E402
import logging  # noqa: E402
import sys  # noqa: E402
from typing import List, Optional  # noqa: E402

import typer  # noqa: E402

from src import __version__  # noqa: E402
from src.cli.audit import audit_data_command, audit_model_command, render_command  # noqa: E402
from src.cli.io import EXIT_ERROR, EXIT_OK  # noqa: E402
from src.cli.learn import mitigate_command, train_command  # noqa: E402
from src.cli.scenarios import gen_scenario_command, simulate_command  # noqa: E402
from src.core.config import settings  # noqa: E402
from src.core.log import configure_logging  # noqa: E402
from src.core.tracing import describe_tracing  # noqa: E402

logger = logging.getLogger("src.main")


def _click_exception_type() -> type:
    """
    Base class of click's usage and parameter errors, taken from the click
    copy typer actually raises (the click package or typer's vendored one).
    """
    for module_name in (typer.Exit.__module__, "click.exceptions"):
        try:
            module = importlib.import_module(module_name)
        except ImportError:
            continue
        found = getattr(module, "ClickException", None)
        if isinstance(found, type):
            return found
    raise RuntimeError("cannot locate click's ClickException")


ClickException = _click_exception_type()


def create_app() -> typer.Typer:
    app = typer.Typer(
        name="fairaudit",
        help="Discrimination-aware classification: audit, train, mitigate, simulate.",
        add_completion=False,
        no_args_is_help=True,
    )

    @app.callback()
    def root(
        log_level: str = typer.Option(settings.log_level, "--log-level", help="Diagnostics level"),
    ) -> None:
        configure_logging(log_level)
        logger.debug("fairaudit %s; %s", __version__, describe_tracing())

    # Commands
    app.command("audit-data")(audit_data_command)
    app.command("audit-model")(audit_model_command)
    app.command("train")(train_command)
    app.command("mitigate")(mitigate_command)
    app.command("simulate")(simulate_command)
    app.command("gen-scenario")(gen_scenario_command)
    app.command("render")(render_command)

    return app


app = create_app()


def main(argv: Optional[List[str]] = None) -> int:
    """Run one command and return its exit code: 0 pass, 1 error, 2 fail, 3 warn."""
    try:
        result = app(args=argv, prog_name="fairaudit", standalone_mode=False)
    except typer.Exit as exc:
        return exc.exit_code
    except ClickException as exc:
        exc.show()
        return EXIT_ERROR
    except typer.Abort:
        typer.echo("aborted", err=True)
        return EXIT_ERROR
    return result if isinstance(result, int) else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

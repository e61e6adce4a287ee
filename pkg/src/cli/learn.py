"""train and mitigate commands."""

import logging
from enum import Enum
from pathlib import Path
from typing import Optional

import typer

from src.audit.render import canonical_json
from src.cli.io import guarded, parse_grid
from src.core.config import settings
from src.core.errors import InvalidParamError
from src.core.files import write_all_atomic, write_text_atomic
from src.data.io import dataset_to_csv, load_csv, load_schema
from src.data.split import split
from src.mitigate.postprocess import group_thresholds
from src.mitigate.preprocess import massage, resample, reweight
from src.mitigate.tuning import tune_fairness_weight
from src.model.logistic import train
from src.model.serialize import load_model, model_to_json
from src.schemas.mitigation import MitigationRecord
from src.schemas.model import Hyperparams

logger = logging.getLogger(__name__)

LEGAL_NOTICE = (
    "WARNING: --include-protected feeds the protected attribute to the model. "
    "Decisions that explicitly depend on it are disparate treatment and carry a "
    "serious risk of legal liability; use such models only to demonstrate the "
    "counterfactual audit."
)


class Method(str, Enum):
    reweight = "pre:reweight"
    resample = "pre:resample"
    massage = "pre:massage"
    thresholds = "post:thresholds"
    tune = "in:tune"


class Target(str, Enum):
    demographic_parity = "demographic_parity"
    equal_opportunity = "equal_opportunity"


def _record_line(record: MitigationRecord) -> str:
    return (
        f"{record.method}: {record.before.name} {record.before.value} -> "
        f"{record.after.value}, changed={record.changed}"
    )


@guarded
def train_command(
    csv: Path = typer.Argument(..., help="Training CSV"),
    schema: Path = typer.Option(..., "--schema"),
    model_out: Path = typer.Option(..., "--model-out", help="Where to write the model JSON"),
    l2: float = typer.Option(1e-4, "--l2", min=0.0),
    fairness: float = typer.Option(0.0, "--fairness", min=0.0, help="Fairness weight eta"),
    cost_fp: float = typer.Option(1.0, "--cost-fp"),
    cost_fn: float = typer.Option(1.0, "--cost-fn"),
    learning_rate: float = typer.Option(0.1, "--learning-rate"),
    max_iters: int = typer.Option(2000, "--max-iters", min=1),
    include_protected: bool = typer.Option(False, "--include-protected"),
    seed: Optional[int] = typer.Option(None, "--seed"),
) -> None:
    """Fit the fairness-regularized logistic model."""
    h = Hyperparams(
        l2=l2,
        fairness=fairness,
        cost_fp=cost_fp,
        cost_fn=cost_fn,
        include_protected=include_protected,
        learning_rate=learning_rate,
        max_iters=max_iters,
        seed=settings.default_seed if seed is None else seed,
    )
    if include_protected:
        typer.echo(LEGAL_NOTICE, err=True)
    dataset = load_csv(csv, load_schema(schema))
    m = train(dataset, h)
    write_text_atomic(model_out, model_to_json(m))
    loss = m.loss_components.total if m.loss_components else float("nan")
    typer.echo(f"trained: converged={m.converged} iterations={m.iterations} loss={loss:.6g}")


@guarded
def mitigate_command(
    method: Method = typer.Argument(..., help="Mitigation method"),
    csv: Path = typer.Argument(..., help="Training CSV (holdout CSV for post:thresholds)"),
    schema: Path = typer.Option(..., "--schema"),
    out: Path = typer.Option(..., "--out", help="Mitigated CSV, or JSON for post:/in: methods"),
    record_out: Optional[Path] = typer.Option(None, "--record-out"),
    model: Optional[Path] = typer.Option(
        None, "--model", help="Scored model (post:thresholds; ranker for pre:massage)"
    ),
    target: Target = typer.Option(Target.demographic_parity, "--target"),
    epsilon: float = typer.Option(0.02, "--epsilon", min=0.0),
    grid_step: float = typer.Option(0.01, "--grid-step"),
    eta_grid: str = typer.Option("0,0.5,1,2,5,10", "--eta-grid"),
    max_accuracy_loss: float = typer.Option(0.02, "--max-accuracy-loss", min=0.0),
    md_tolerance: float = typer.Option(0.0, "--md-tolerance", min=0.0),
    validation: Optional[Path] = typer.Option(None, "--validation"),
    holdout_fraction: float = typer.Option(0.3, "--holdout-fraction"),
    threshold: float = typer.Option(0.5, "--threshold", min=0.0, max=1.0),
    seed: Optional[int] = typer.Option(None, "--seed"),
) -> None:
    """Apply one pre-, in- or post-processing mitigation and report before/after."""
    seed = settings.default_seed if seed is None else seed
    if method is Method.thresholds and model is None:
        raise InvalidParamError("post:thresholds needs --model")
    grid = parse_grid(eta_grid) if method is Method.tune else []
    schema_doc = load_schema(schema)
    dataset = load_csv(csv, schema_doc)
    ranker = load_model(model) if model is not None else None

    result: bytes
    if method in (Method.reweight, Method.resample, Method.massage):
        if method is Method.reweight:
            mitigated, record = reweight(dataset)
        elif method is Method.resample:
            mitigated, record = resample(dataset, seed)
        else:
            mitigated, record = massage(dataset, ranker)
        result = dataset_to_csv(mitigated)
    elif method is Method.thresholds:
        assert ranker is not None
        pair, record = group_thresholds(
            ranker,
            dataset,
            target.value,  # type: ignore[arg-type]
            epsilon,
            grid_step,
            base_threshold=threshold,
        )
        result = canonical_json({"thresholds": pair.model_dump(mode="json")})
    else:
        if validation is not None:
            d_train, d_val = dataset, load_csv(validation, schema_doc)
        else:
            d_train, d_val = split(dataset, holdout_fraction, seed)
        base = ranker.hyperparams if ranker is not None else Hyperparams(seed=seed)
        chosen, record = tune_fairness_weight(
            d_train, d_val, grid, max_accuracy_loss, base, md_tolerance, threshold
        )
        result = canonical_json({"hyperparams": chosen.model_dump(mode="json")})

    outputs = {out: result}
    if record_out is not None:
        outputs[record_out] = canonical_json(record.model_dump(mode="json"))
    write_all_atomic(outputs)
    typer.echo(_record_line(record))

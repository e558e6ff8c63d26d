import config
from dependencies import add_format_argument, int_at_least, size_type
from exceptions import UsageError
from penner_series import ModelId, Orientation, build_model, is_symbolic
import schemas

# CLI model names; triple-sum picks its variant from --alpha
MODEL_CHOICES = {
    "hermitian": ModelId.HERMITIAN_GF,
    "symplectic": ModelId.SYMPLECTIC_GF,
    "orthogonal": ModelId.ORTHOGONAL_GF,
    "nonorientable-product": ModelId.NONORIENTABLE_PRODUCT,
    "nonorientable-gf": ModelId.NONORIENTABLE_GF,
    "closed-form": ModelId.PENNER_CLOSED_FORM,
    "stirling-tail": ModelId.STIRLING_TAIL,
    "triple-sum": None,
}


def register(subparsers):
    parser = subparsers.add_parser("series", help="print a generating function as a truncated t-series")
    parser.add_argument("--model", choices=list(MODEL_CHOICES), required=True)
    parser.add_argument("--alpha", type=int, choices=[1, 2], default=1, help="triple-sum variant")
    parser.add_argument("--N", dest="size", type=size_type, required=True, help="matrix size or 'sym'")
    parser.add_argument("--order", type=int_at_least(0), default=config.DEFAULT_ORDER, help="hermitian alone accepts 0")
    parser.add_argument("--orientation", choices=[o.value for o in Orientation], default=Orientation.RECIPROCAL.value)
    add_format_argument(parser)
    parser.set_defaults(handler=handle)


def resolve_model(name: str, alpha: int) -> ModelId:
    if name == "triple-sum":
        return ModelId.HERMITIAN_TRIPLE if alpha == 1 else ModelId.SYMPLECTIC_TRIPLE
    return MODEL_CHOICES[name]


def handle(args):
    model_id = resolve_model(args.model, args.alpha)
    if model_id == ModelId.PENNER_CLOSED_FORM and is_symbolic(args.size):
        raise UsageError("--N: closed-form needs a concrete matrix size, not 'sym'")
    if args.order < 1 and model_id != ModelId.HERMITIAN_GF:
        raise UsageError(f"--order: {args.model} needs an order >= 1, got {args.order}")
    s = build_model(model_id, args.size, args.order, Orientation(args.orientation))
    if args.format == "text":
        return str(s), 0
    return schemas.serialize_tseries(s), 0

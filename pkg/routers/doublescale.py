import config
from continuum_limit import ScalingPoint, double_scaling_residual
from dependencies import add_format_argument, int_at_least
import schemas


def register(subparsers):
    parser = subparsers.add_parser("doublescale", help="finite-N residual against the non-orientable continuum tail")
    parser.add_argument("--mu", type=float, default=config.DEFAULT_MU)
    parser.add_argument("--N", dest="size", type=int_at_least(1), required=True)
    parser.add_argument("--qmax", type=int_at_least(1), default=config.DEFAULT_Q_MAX)
    parser.add_argument("--workers", type=int_at_least(1), default=config.DEFAULT_WORKERS)
    parser.add_argument("--oracle", action="store_true", help="evaluate the sum with the mpmath Gamma form")
    add_format_argument(parser)
    parser.set_defaults(handler=handle)


def handle(args):
    check = double_scaling_residual(ScalingPoint(args.size, args.mu), args.qmax, args.workers, oracle=args.oracle)
    if args.format == "text":
        out = schemas.residual_out(check)
        return (
            f"N={out.N} mu={out.mu} t={out.t} q_max={out.q_max}\n"
            f"residual={out.residual} target={out.target} abs_error={out.abs_error}"
        ), 0
    return schemas.serialize_residual(check), 0

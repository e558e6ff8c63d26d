import config
from continuum_limit import ContinuumModel, build_continuum, density_of_states_series, wick_rotate
from dependencies import add_format_argument, int_at_least
import schemas

DENSITY = "density"


def register(subparsers):
    parser = subparsers.add_parser("continuum", help="double-scaling free energies as mu-series")
    parser.add_argument("--model", choices=[m.value for m in ContinuumModel] + [DENSITY], required=True)
    parser.add_argument("--gmax", type=int_at_least(2), default=config.DEFAULT_G_MAX)
    parser.add_argument("--kmax", type=int_at_least(1), default=config.DEFAULT_K_MAX)
    parser.add_argument("--mmax", type=int_at_least(1), default=config.DEFAULT_M_MAX, help="density of states truncation")
    parser.add_argument("--wick", action="store_true", help="apply mu -> i mu to the result")
    add_format_argument(parser)
    parser.set_defaults(handler=handle)


def handle(args):
    if args.model == DENSITY:
        s = density_of_states_series(args.mmax)
    else:
        s = build_continuum(args.model, args.gmax, args.kmax)
    if args.wick:
        s = wick_rotate(s)
    if args.format == "text":
        lines = [str(s)] + [f"note: {n}" for n in s.notes]
        return "\n".join(lines), 0
    return schemas.serialize_museries(s), 0

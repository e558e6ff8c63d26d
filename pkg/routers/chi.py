from dependencies import int_at_least
from exceptions import UsageError
from euler_char import (
    ChiKind,
    ChiValue,
    chi_complex,
    chi_complex_unpunctured,
    chi_real,
    chi_real_unpunctured,
    chi_table,
)
from exact_core import format_rational
import schemas


def register(subparsers):
    parser = subparsers.add_parser("chi", help="orbifold Euler characteristics")
    parser.add_argument("action", nargs="?", choices=["value", "table"], default="value")
    parser.add_argument("--kind", choices=[k.value for k in ChiKind], required=True)
    parser.add_argument("--g", type=int, help="genus (complex) or genus index q (real)")
    parser.add_argument("--n", type=int, help="number of punctures; 0 for the unpunctured value")
    parser.add_argument("--gmax", type=int_at_least(0))
    parser.add_argument("--nmax", type=int_at_least(0))
    parser.add_argument("--format", choices=["text", "json", "csv"])
    parser.set_defaults(handler=handle)


def chi_value(kind: ChiKind, g: int, n: int) -> ChiValue:
    if n == 0:
        value = chi_complex_unpunctured(g) if kind == ChiKind.COMPLEX else chi_real_unpunctured(g)
    else:
        value = chi_complex(g, n) if kind == ChiKind.COMPLEX else chi_real(g, n)
    return ChiValue(kind, g, n, value)


def handle(args):
    kind = ChiKind(args.kind)
    if args.action == "table":
        if args.gmax is None or args.nmax is None:
            raise UsageError("chi table needs --gmax and --nmax")
        fmt = args.format or "csv"
        if fmt not in ("csv", "json"):
            raise UsageError("--format: chi table supports csv or json")
        rows = chi_table(kind, args.gmax, args.nmax)
        if fmt == "csv":
            return schemas.chi_table_csv(rows), 0
        return schemas.serialize_chi_table(rows), 0

    if args.g is None or args.n is None:
        raise UsageError("chi needs --g and --n")
    value = chi_value(kind, args.g, args.n)
    fmt = args.format or "text"
    if fmt == "json":
        return schemas.chi_value_out(value).model_dump_json(), 0
    if fmt == "csv":
        return schemas.chi_table_csv([value]), 0
    return format_rational(value.value), 0

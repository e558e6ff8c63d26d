import config
from dependencies import add_format_argument, int_at_least, size_type
from penner_series import IDENTITY_ALIASES, Identity, verify_identity
import schemas

IDENTITY_CHOICES = [i.value for i in Identity] + list(IDENTITY_ALIASES)


def register(subparsers):
    parser = subparsers.add_parser("verify", help="check an identity between generating functions exactly")
    parser.add_argument("--identity", choices=IDENTITY_CHOICES, required=True)
    parser.add_argument("--N", dest="size", type=size_type, required=True, help="matrix size or 'sym'")
    parser.add_argument("--order", type=int_at_least(1), default=config.DEFAULT_ORDER)
    add_format_argument(parser)
    parser.set_defaults(handler=handle)


def handle(args):
    report = verify_identity(args.identity, args.size, args.order)
    exit_code = 0 if report.matched else 1
    if args.format == "text":
        return schemas.report_text(report), exit_code
    return schemas.serialize_report(report), exit_code

import argparse

from .commands import router
from .routing import CommandResult, CommandRouter, UsageError


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tiltwork",
        description="Exact computations with tilting complexes over finite-dimensional algebras.",
    )
    parser.add_argument("--field", help="override the ground field: a prime or 'rational'")
    parser.add_argument("--seed", type=int, help="seed for the randomized searches")
    parser.add_argument("--max-stage", type=int, help="largest number of completion stages accepted")
    parser.add_argument("--report", help="write the JSON report here instead of stdout")
    parser.add_argument("--timings", action="store_true", help="record wall-clock timings in the report")
    parser.add_argument("--log-level", help="logging level (DEBUG, INFO, ...)")
    verbs = parser.add_subparsers(dest="command", metavar="COMMAND")
    verbs.required = True
    for route in router.routes():
        sub = verbs.add_parser(route.name, help=route.help, description=route.help)
        route.configure(sub)
    return parser


__all__ = ["CommandResult", "CommandRouter", "UsageError", "build_parser", "router"]

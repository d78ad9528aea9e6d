"""Finite determinacy of germs over Q and F_p."""

import json

from ._germdet import (
    EngineError,
    brute_force_determinacy,
    colength,
    format_polynomial,
    run_cli,
    run_request,
    version,
)

__all__ = [
    "EngineError",
    "analyze",
    "orbit",
    "oracle",
    "brute_force_determinacy",
    "colength",
    "format_polynomial",
    "run_cli",
    "run_request",
    "version",
]


def _argv(command, germ, kind, options):
    argv = [command, "--" + kind, germ]
    for key, value in options.items():
        if value is None or value is False:
            continue
        flag = "--" + key.replace("_", "-")
        if value is True:
            argv.append(flag)
        elif isinstance(value, (list, tuple)):
            argv += [flag, ",".join(str(v) for v in value)]
        else:
            argv += [flag, str(value)]
    return argv


def _run(command, germ, kind, options):
    return json.loads(run_request(_argv(command, germ, kind, options)))


def analyze(poly=None, *, map=None, matrix=None, **options):
    kind, germ = _pick(poly, map, matrix)
    return _run("analyze", germ, kind, options)


def orbit(poly=None, *, perturb, map=None, matrix=None, **options):
    kind, germ = _pick(poly, map, matrix)
    return _run("orbit", germ, kind, dict(options, perturb=perturb))


def oracle(poly, **options):
    return _run("oracle", poly, "poly", options)


def _pick(poly, map, matrix):
    given = [(k, v) for k, v in (("poly", poly), ("map", map), ("matrix", matrix)) if v is not None]
    if len(given) != 1:
        raise ValueError("give exactly one of poly, map, matrix")
    return given[0]

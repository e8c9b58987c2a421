"""Python front end for the ctk congruence toolkit."""

import json

from ._ctk import (
    DomainError,
    SchemaError,
    __version__,
    content_digest,
    cuspidal_rank,
    hecke_charpoly,
    is_critical_at_1,
    random_instance,
    run_cli,
    snf,
)


class CliError(RuntimeError):
    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


def run(*args):
    """Run a subcommand and return its ResultRecord as a dict."""
    code, out, err = run_cli([str(a) for a in args])
    if code != 0:
        raise CliError(code, err.strip())
    return json.loads(out)


__all__ = [
    "CliError",
    "DomainError",
    "SchemaError",
    "__version__",
    "content_digest",
    "cuspidal_rank",
    "hecke_charpoly",
    "is_critical_at_1",
    "random_instance",
    "run",
    "run_cli",
    "snf",
]

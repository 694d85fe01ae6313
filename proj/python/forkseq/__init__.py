"""Shared-register operation histories: generate the fixed two-client
interleavings, simulate client/server runs, and decide sequential
consistency, fork sequential consistency and wait-freedom on trace text."""

try:
    from ._forkseq import builtin_config, check, explain, generate, simulate
except ImportError:
    # Source checkouts put the extension on sys.path as a top-level module
    # (see tests/python/conftest.py); installed wheels ship it in-package.
    from _forkseq import builtin_config, check, explain, generate, simulate

__all__ = ["builtin_config", "check", "explain", "generate", "simulate"]

"""Qunity language toolchain: parser, typechecker, interpreter, and circuit compiler."""

__version__ = "0.1.0"

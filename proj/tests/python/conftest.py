import os
import pathlib
import sys


def _add(path):
    if path.is_dir() and str(path) not in sys.path:
        sys.path.insert(0, str(path))


# Run against the source package plus the cmake-built extension; an installed
# wheel works too and needs neither path.
_root = pathlib.Path(__file__).resolve().parents[2]
_add(_root / "python")
_module_dir = os.environ.get("FORKSEQ_MODULE_DIR")
if _module_dir:
    _add(pathlib.Path(_module_dir))
else:
    _add(_root / "build" / "bindings")

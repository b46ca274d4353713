import pathlib
import sys

# allow running the suite from a fresh checkout without installation
_src = pathlib.Path(__file__).resolve().parent.parent / "src"
if str(_src) not in sys.path:
    sys.path.insert(0, str(_src))

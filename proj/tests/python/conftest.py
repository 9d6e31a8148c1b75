import os
import sys

# When run through ctest, the staged package lives in the build tree.
_build_python = os.environ.get("GTSHAP_PYTHON_DIR")
if _build_python and _build_python not in sys.path:
    sys.path.insert(0, _build_python)

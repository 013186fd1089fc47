import os
import sys

# When run from the CMake tree (not an installed wheel), wire the built
# extension and the source package together.
core_dir = os.environ.get("DKR_CORE_DIR")
src = os.environ.get("DKR_SRC")
if core_dir and src:
    sys.path.insert(0, core_dir)
    sys.path.insert(0, os.path.join(src, "python"))
    import _core

    sys.modules.setdefault("dkr._core", _core)

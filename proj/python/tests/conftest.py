import os
import sys

build_dir = os.environ.get("MINMIX_BUILD_DIR")
if build_dir:
    sys.path.insert(0, build_dir)
py_src = os.environ.get("MINMIX_PY_SRC")
if py_src:
    sys.path.insert(0, py_src)

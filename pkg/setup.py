"""Optional compiled kernel: cythonize the pure-Python hot module into
r2wb._kernel._core_c; the package falls back to the interpreted module
when the extension is absent."""

import os
import shutil

from setuptools import setup

ext_modules = []
if not os.environ.get("R2WB_NO_EXT"):
    try:
        from Cython.Build import cythonize

        src = os.path.join("src", "r2wb", "_kernel", "core.py")
        dst = os.path.join("src", "r2wb", "_kernel", "_core_c.py")
        shutil.copyfile(src, dst)
        ext_modules = cythonize(
            [dst], compiler_directives={"language_level": "3"})
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)

import os
import sys

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("PTCHAIN_NO_EXT", "") in ("", "0"):
    try:
        from Cython.Build import cythonize
    except ImportError:
        print("Cython not found; building without the compiled kernels", file=sys.stderr)
    else:
        ext_modules = cythonize(
            [
                Extension(
                    "ptchain.linalg._kernels",
                    [os.path.join("src", "ptchain", "linalg", "_kernels.pyx")],
                    extra_compile_args=[] if sys.platform == "win32" else ["-O3", "-fcx-limited-range"],
                )
            ],
            compiler_directives={"language_level": 3},
        )

setup(ext_modules=ext_modules)

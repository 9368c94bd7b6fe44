"""Build script: compiles the optional C++ polynomial kernels.

The package is pure Python plus one optional Cython extension
(``adjkit._termkernels_c``).  If Cython or a C++ toolchain is missing the
extension is skipped and the pure-Python kernels are used instead; nothing
else changes.  Build in place with::

    python setup.py build_ext --inplace
"""

from setuptools import setup

try:
    from setuptools import Extension

    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "adjkit._termkernels_c",
                ["src/adjkit/_termkernels_c.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
        compiler_directives={
            "boundscheck": False,
            "wraparound": False,
            "initializedcheck": False,
            "cdivision": True,
        },
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)

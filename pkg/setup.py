"""Build script for the optional compiled kernel extension.

The package is fully functional without the extension; `entcomb.kernels`
falls back to the numpy implementations when `entcomb._ckernels` is not
importable. `optional=True` keeps installation alive on toolchain-less
machines.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "entcomb._ckernels",
                ["src/entcomb/_ckernels.pyx"],
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)

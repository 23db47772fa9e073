"""Build script: compiles the optional C kernel extension.

If Cython is unavailable the package installs without the extension and
falls back to the pure NumPy kernels at import time.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

if cythonize is not None:
    extensions = cythonize(
        [
            Extension(
                "elske.kernels._ckernels",
                ["src/elske/kernels/_ckernels.pyx"],
                language="c++",
                extra_compile_args=["-O3", "-std=c++17"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
else:
    extensions = []

setup(ext_modules=extensions)

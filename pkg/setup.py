import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

ext_modules = []
if cythonize is not None:
    # No -ffast-math: the kernels must keep strict IEEE semantics so the
    # compiled and pure backends agree bit-for-bit on hashed embeddings.
    ext_modules = cythonize(
        [
            Extension(
                "streamtopics._speedups",
                ["src/streamtopics/_speedups.pyx"],
                include_dirs=[np.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)

import os

import numpy as np
from Cython.Build import cythonize
from setuptools import Extension, setup

flags = ["-O3"]
if not os.environ.get("REFSIM_PORTABLE"):
    flags.append("-march=native")

extensions = [
    Extension(
        "refsim.batch._kernel",
        ["src/refsim/batch/_kernel.pyx"],
        include_dirs=[np.get_include()],
        extra_compile_args=flags,
    )
]

setup(ext_modules=cythonize(extensions, compiler_directives={"language_level": "3"}))

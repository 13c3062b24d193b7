# The compiled kernel is optional: without Cython (or a compiler) the package
# installs pure-Python and qhpp.hj._kernels falls back automatically.
from setuptools import setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        ["src/qhpp/hj/_ckernels.pyx"],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)

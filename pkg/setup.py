from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # the package still works through its Python kernels
    ext_modules = []
else:
    ext_modules = cythonize(
        [Extension("udcsp._kernels", ["src/udcsp/_kernels.pyx"], extra_compile_args=["-O3"])],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)

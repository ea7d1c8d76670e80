from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    # Without Cython the package installs with the pure-Python kernel only.
    ext_modules = []
else:
    ext_modules = cythonize(
        [Extension("reflexlisp._ckernel", ["src/reflexlisp/_ckernel.pyx"])],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)

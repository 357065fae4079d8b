from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    # The compiled core is optional: rigidlab.kernels falls back to the
    # pure-Python twin when the extension is absent.
    ext_modules = []
else:
    ext_modules = cythonize(
        [Extension("rigidlab._fastcore", ["src/rigidlab/_fastcore.pyx"])],
        language_level=3,
    )

setup(ext_modules=ext_modules)

from setuptools import setup

# The compiled elimination kernel is optional: if Cython or a C compiler is
# missing, the package installs anyway and gencx.linalg falls back to the
# pure-Python twin in gencx/elim.py.
try:
    from Cython.Build import cythonize
    from setuptools import Extension

    extensions = cythonize(
        [Extension("gencx._elim", ["src/gencx/_elim.pyx"])],
        compiler_directives={"language_level": "3"},
    )
except Exception:
    extensions = []

setup(ext_modules=extensions)

from setuptools import Extension, setup

# The compiled kernel is optional: the package falls back to the pure-Python
# implementation in privzone._qmcore_py when the extension is unavailable.
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "privzone._qmcore",
                ["src/privzone/_qmcore.pyx"],
                language="c++",
            )
        ],
        language_level=3,
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)

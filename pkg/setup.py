from setuptools import Extension, setup

try:
    import numpy
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "burafrac._kernels._cykernels",
                ["src/burafrac/_kernels/_cykernels.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O2"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_9_API_VERSION")],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    # no Cython/numpy at build time: the pure-python kernel backend is
    # selected at import, so the package still works without the extension
    extensions = []

setup(ext_modules=extensions)

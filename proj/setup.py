from pybind11.setup_helpers import ParallelCompile, Pybind11Extension, build_ext
from setuptools import setup

ParallelCompile("NPY_NUM_BUILD_JOBS").install()

ext_modules = [
    Pybind11Extension(
        "choicepa._core",
        sources=[
            "src/model.cpp",
            "src/observables.cpp",
            "src/theory.cpp",
            "src/exact.cpp",
            "src/harness.cpp",
            "src/bindings.cpp",
        ],
        include_dirs=["include"],
        cxx_std=20,
    ),
]

setup(ext_modules=ext_modules, cmdclass={"build_ext": build_ext})

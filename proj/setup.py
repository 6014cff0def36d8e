"""Builds the _chdg extension by delegating to the project's CMake setup."""

import os
import subprocess
import sys
from pathlib import Path

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class CMakeExtension(Extension):
    def __init__(self, name):
        super().__init__(name, sources=[])


class CMakeBuild(build_ext):
    def build_extension(self, ext):
        source_dir = Path(__file__).resolve().parent
        build_dir = Path(self.build_temp).resolve()
        build_dir.mkdir(parents=True, exist_ok=True)

        out_dir = Path(self.get_ext_fullpath(ext.name)).resolve().parent
        out_dir.mkdir(parents=True, exist_ok=True)

        cfg = "Debug" if self.debug else "Release"
        subprocess.run(
            [
                "cmake",
                str(source_dir),
                f"-DCMAKE_BUILD_TYPE={cfg}",
                f"-DCMAKE_LIBRARY_OUTPUT_DIRECTORY={out_dir}",
                f"-DPython3_EXECUTABLE={sys.executable}",
            ],
            cwd=build_dir,
            check=True,
        )
        subprocess.run(
            ["cmake", "--build", str(build_dir), "--target", "_chdg",
             "-j", str(os.cpu_count() or 2)],
            check=True,
        )


setup(
    ext_modules=[CMakeExtension("chdg._chdg")],
    cmdclass={"build_ext": CMakeBuild},
)

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
        extdir = Path(self.get_ext_fullpath(ext.name)).parent.resolve()
        build_temp = Path(self.build_temp).resolve()
        build_temp.mkdir(parents=True, exist_ok=True)
        src = Path(__file__).parent.resolve()
        subprocess.run(
            ["cmake", "-S", str(src), "-B", str(build_temp),
             f"-DCMAKE_LIBRARY_OUTPUT_DIRECTORY={extdir}",
             f"-DPYTHON_EXECUTABLE={sys.executable}",
             "-DCMAKE_BUILD_TYPE=Release",
             "-DWEYL_BUILD_TESTS=OFF"],
            check=True)
        subprocess.run(
            ["cmake", "--build", str(build_temp), "--target", "_weyl"],
            check=True)


setup(cmdclass={"build_ext": CMakeBuild}, ext_modules=[CMakeExtension("weyl._weyl")])

"""Builds the holevo_lab extension module by delegating to cargo.

Use `pip install -e . --no-build-isolation`; the Rust toolchain must be on
PATH. The compiled cdylib from crates/holevo-py is copied to wherever
setuptools expects the extension artifact.
"""

import shutil
import subprocess
import sys
from pathlib import Path

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext

ROOT = Path(__file__).resolve().parent


class CargoExtension(Extension):
    def __init__(self, name: str, crate: str):
        super().__init__(name, sources=[])
        self.crate = crate


class CargoBuild(build_ext):
    def build_extension(self, ext: CargoExtension) -> None:
        subprocess.run(
            ["cargo", "build", "--release", "-p", ext.crate],
            cwd=ROOT,
            check=True,
        )
        libname = {
            "win32": f"{ext.name}.dll",
            "darwin": f"lib{ext.name}.dylib",
        }.get(sys.platform, f"lib{ext.name}.so")
        artifact = ROOT / "target" / "release" / libname
        dest = Path(self.get_ext_fullpath(ext.name))
        dest.parent.mkdir(parents=True, exist_ok=True)
        shutil.copyfile(artifact, dest)


setup(
    ext_modules=[CargoExtension("holevo_lab", crate="holevo-py")],
    cmdclass={"build_ext": CargoBuild},
)

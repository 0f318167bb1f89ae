from setuptools import setup, find_packages

from omega_ideals import __version__

setup(
    name="omega-ideals",
    version=__version__,
    description="Ideals on ω, tallness and FK duality witnesses",
    packages=find_packages(),
    python_requires=">=3.8",
    install_requires=["python-dotenv>=1.0.0"],
    extras_require={"test": ["pytest>=7.4", "hypothesis>=6.92"]},
    entry_points={"console_scripts": ["omega-ideals=omega_ideals.main:main"]},
)

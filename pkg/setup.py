from setuptools import setup, find_packages

with open("README.md", "r", encoding="utf-8") as fh:
    long_description = fh.read()

setup(
    name="diskbench",
    version="0.1.0",
    description="Numerical workbench for Bergman projections, Beurling transforms and holomorphic motions on the unit disk",
    long_description=long_description,
    long_description_content_type="text/markdown",
    classifiers=[
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.8",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "License :: OSI Approved :: BSD License",
        "Operating System :: OS Independent",
        "Environment :: Console",
        "Intended Audience :: Science/Research",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
    packages=find_packages(exclude=["tests", "tests.*", "examples", "examples.*"]),
    include_package_data=True,
    package_data={"diskbench": ["templates/*.html", "templates/*.json"]},
    python_requires=">=3.8",
    install_requires=[
        "numpy>=1.22.0",
        "scipy>=1.8.0",
        "rich>=10.0.0",
        "markdown>=3.3.0",
        "jinja2>=3.0.0",
    ],
    entry_points={
        "console_scripts": [
            "diskbench=diskbench.cli:main",
        ],
    },
)

import os
from setuptools import setup, find_packages

# Read long description from file
with open("README.md", "r") as fh:
    long_description = fh.read()

# Read requirements from file
install_requires = []
root_dir = os.path.dirname(os.path.realpath(__file__))
req = root_dir + '/requirements.txt'
if os.path.isfile(req):
    with open(req) as f:
        install_requires = f.read().splitlines()

setup(
    name="SUMusic",
    version="0.1.0",
    description="Generic music summarization with text summarization algorithms",
    long_description=long_description,
    long_description_content_type="text/markdown",
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Environment :: Console",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: Apache Software License",
        "Natural Language :: English",
        "Programming Language :: Python :: 3.8",
        "Programming Language :: Python :: 3.9",
        "Topic :: Multimedia :: Sound/Audio :: Analysis",
        "Topic :: Scientific/Engineering :: Information Analysis",
        "Typing :: Typed",
    ],
    entry_points={
        'console_scripts': [
            'sumusic = SUMusic.cli:main',
        ],
    },
    keywords=(
        'music summarization audio genre classification grasshopper lexrank '
        'lsa mmr support sets'
    ),
    packages=find_packages(exclude=["tests", "benchmarks"]),
    install_requires=install_requires,
    python_requires='>=3.8',
    include_package_data=True,
    package_data={
        "SUMusic": ["config/config.yaml"],
    },
)

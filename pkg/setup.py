import codecs
import os
import sys

try:  # for pip >= 10
    from pip._internal.req import parse_requirements
except ImportError:  # for pip <= 9.0.3
    from pip.req import parse_requirements

from setuptools import setup, find_packages
from setuptools.command.install import install

VERSION = "0.3.0"
AUTHOR = "stacount developers"
EMAIL = "stacount@users.noreply.github.com"
HERE = os.path.abspath(os.path.dirname(__file__))


def read(*parts):
    """
    Build an absolute path from *parts* and and return the contents of the
    resulting file.  Assume UTF-8 encoding.
    """
    with codecs.open(os.path.join(HERE, *parts), "rb", "utf-8") as f:
        return f.read()


class VerifyVersionCommand(install):
    """Custom command to verify that the git tag matches our version"""
    description = 'verify that the git tag matches our version'

    def run(self):
        tag = os.getenv('CI_TAG')

        if tag is None:
            sys.exit("The 'verify' option is only available in a tagged CI "
                     "build")

        if tag != VERSION:
            message = "Git tag: {0} does not match the version of this app: {1}"
            sys.exit(message.format(tag, VERSION))


def _requirement(r):
    # pip >= 20 hands back ParsedRequirement with .requirement
    return str(getattr(r, 'requirement', None) or r.req)


requirements = [
    _requirement(r) for r in
    parse_requirements('requirements.txt', session=False)
]

setup(
    name="stacount",
    description="Approximate propositional model counting with "
                "satisfiability queries only.",
    license="BSD",
    url="https://github.com/stacount/stacount",
    version=VERSION,
    author=AUTHOR,
    author_email=EMAIL,
    maintainer=AUTHOR,
    maintainer_email=EMAIL,
    keywords=["model counting", "sat", "xor hashing", "#sat"],
    long_description=read("README.rst"),
    packages=find_packages(exclude=['tests*']),
    classifiers=[
        "Development Status :: 4 - Beta",
        "Intended Audience :: Science/Research",
        "Natural Language :: English",
        "License :: OSI Approved :: BSD License",
        "Operating System :: OS Independent",
        "Programming Language :: Python",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.8",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: Implementation :: CPython",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
    python_requires=">=3.8",
    install_requires=requirements,
    tests_require=['mock'],
    include_package_data=True,
    test_suite='tests',
    entry_points={
        'console_scripts': ['stacount = stacount.caller:main'],
    },
    cmdclass={'verify': VerifyVersionCommand}
)

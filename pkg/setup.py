import os

from setuptools import find_packages, setup

# Load requirements from requirements.txt
current_dir = os.path.dirname(os.path.realpath(__file__))
requirements_path = os.path.join(current_dir, 'requirements.txt')

install_requires = None
if os.path.isfile(requirements_path):
    with open(requirements_path, 'r') as f:
        install_requires = f.read().splitlines()

setup(name='eigensense',
      version='0.1.0',
      description='Blind cooperative spectrum sensing with random matrix theory',
      packages=find_packages(exclude=['tests', 'tests.*']),
      python_requires='>=3.8',
      install_requires=install_requires,
      entry_points={
        'console_scripts': [
            'eigensense = eigensense.cli:run',
        ]
      },
      extras_require={
        'dev': [
            'pytest',
            'mypy',
            'pylint',
            'autopep8'
        ]
      }
)

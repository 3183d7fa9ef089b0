"""Exact verification toolkit for expected and amortized expected runtimes
of probabilistic pointer programs.

Subpackages:

* ``state``/``extreal`` - program states and exact extended rationals
* ``syntax``/``parser`` - the guarded-command language and runtime grammar
* ``rsl`` - runtime separation-logic expressions and their evaluator
* ``ert``/``aert`` - the expected-runtime transformers and law checkers
* ``mdp`` - small-step semantics, exact expected rewards, simulation
* ``corpus``/``laws``/``cli`` - bundled study programs, randomized law
  suites and the command-line front end
"""

__version__ = "0.1.0"

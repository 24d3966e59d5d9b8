"""lvevo: evolution in predator-prey Lotka-Volterra systems.

Closed-form equilibria and coexistence tests (:mod:`lvevo.lv`), the
mutation-driven evolution processes (:mod:`lvevo.evolution`), branching random
walks and their rate function (:mod:`lvevo.brw`), estimators
(:mod:`lvevo.analysis`) and a command line (``python -m lvevo``).
"""

__version__ = "1.0.0"

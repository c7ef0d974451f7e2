"""
Error types raised across dipolar_eit.
Each carries the exit code the command line reports for it.
"""


class DipolarEitError(Exception):
    """Base class for all simulation errors"""
    exit_code = 1


class ScenarioError(DipolarEitError, ValueError):
    """Scenario document failed to load or validate"""

    def __init__(self, message, details=None):
        super().__init__(message)
        self.details = details or {}

    def __str__(self):
        if not self.details:
            return super().__str__()
        parts = []
        for field, problems in sorted(self.details.items()):
            if isinstance(problems, (list, tuple)):
                problems = '; '.join(str(p) for p in problems)
            parts.append(f'{field}: {problems}')
        return f"{super().__str__()} ({', '.join(parts)})"


class KernelDomainError(DipolarEitError, ValueError):
    """Evaluation outside the domain where a closed form holds"""


class GridError(DipolarEitError, ValueError):
    """Grid cannot resolve the interaction kernel or is malformed"""


class SolverAbort(DipolarEitError, RuntimeError):
    """Time stepping produced a non-finite state"""
    exit_code = 2

    def __init__(self, message, step=None, time=None):
        super().__init__(message)
        self.step = step
        self.time = time

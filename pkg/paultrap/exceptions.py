from django.core.exceptions import ValidationError


class PaulTrapError(Exception):
    """Base class for every error raised by the toolkit."""
    exit_code = 1
    kind = 'error'

    @property
    def details(self):
        return {}

    @property
    def text(self):
        messages = getattr(self, 'messages', None)
        if messages:
            return '; '.join(str(m) for m in messages)
        return str(self)


class TrapValidationError(PaulTrapError, ValidationError):
    """Inputs violate a precondition. Maps to CLI exit code 2."""
    exit_code = 2
    kind = 'validation'


class DomainError(TrapValidationError):
    """Field evaluated at or below the electrode plane."""
    kind = 'domain'


class NotConfiningError(TrapValidationError):
    kind = 'not_confining'

    def __init__(self, message, eigenvalues=()):
        super().__init__(message)
        self.eigenvalues = [float(v) for v in eigenvalues]

    @property
    def details(self):
        return {'eigenvalues': self.eigenvalues}


class StaticInstabilityError(TrapValidationError):
    kind = 'static_instability'

    def __init__(self, message, kappa):
        super().__init__(message)
        self.kappa = float(kappa)

    @property
    def details(self):
        return {'kappa': self.kappa}


class ConvergenceError(PaulTrapError):
    """An iterative solver hit its cap. Maps to CLI exit code 3."""
    exit_code = 3
    kind = 'convergence'

    def __init__(self, message, last_iterate=None, residual=None):
        super().__init__(message)
        self.last_iterate = None if last_iterate is None else [float(v) for v in last_iterate]
        self.residual = None if residual is None else float(residual)

    @property
    def details(self):
        return {'last_iterate': self.last_iterate, 'residual': self.residual}


class InfeasibleWaveformError(ConvergenceError):
    kind = 'infeasible_waveform'

    def __init__(self, message, constraint, step, residual=None):
        super().__init__(message, residual=residual)
        self.constraint = constraint
        self.step = step

    @property
    def details(self):
        return {'constraint': self.constraint, 'step': self.step, 'residual': self.residual}


class SaddleNotFoundError(ConvergenceError):
    kind = 'saddle_not_found'

    def __init__(self, message, box):
        super().__init__(message)
        self.box = float(box)

    @property
    def details(self):
        return {'box_m': self.box}

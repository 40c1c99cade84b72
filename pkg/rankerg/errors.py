# Copyright (c) 2024, The rankerg developers. All rights reserved.
# See LICENSE.txt for complete terms.


class ValidationError(Exception):
    """Base class for rejected inputs. The CLI maps it to exit code 1."""


class NumericalError(Exception):
    """Base class for numerical failures. The CLI maps it to exit code 2."""


class InvalidGroupError(ValidationError):
    def __init__(self, message, spec):
        super(InvalidGroupError, self).__init__(message)
        self.spec = spec


class InvalidParameterError(ValidationError):
    def __init__(self, message, param):
        super(InvalidParameterError, self).__init__(message)
        self.param = param


class PurityError(ValidationError):
    def __init__(self, message, violations):
        super(PurityError, self).__init__(message)
        self.violations = violations


class PreconditionError(ValidationError):
    def __init__(self, message, name, value):
        super(PreconditionError, self).__init__(message)
        self.name = name
        self.value = value


class ObservableError(ValidationError):
    def __init__(self, message, observable):
        super(ObservableError, self).__init__(message)
        self.observable = observable


class ConfigError(ValidationError):
    def __init__(self, message, path, key=None):
        super(ConfigError, self).__init__(message)
        self.path = path
        self.key = key


class GammaPoleError(NumericalError):
    def __init__(self, message, z):
        super(GammaPoleError, self).__init__(message)
        self.z = z


class DegenerateParameterError(NumericalError):
    def __init__(self, message, params):
        super(DegenerateParameterError, self).__init__(message)
        self.params = params


class ConvergenceError(NumericalError):
    def __init__(self, message, diagnostics=None):
        super(ConvergenceError, self).__init__(message)
        self.diagnostics = diagnostics or {}


class SeriesConvergenceError(ConvergenceError):
    def __init__(self, message, terms, diagnostics=None):
        super(SeriesConvergenceError, self).__init__(message, diagnostics)
        self.terms = terms


class QuadratureError(ConvergenceError):
    def __init__(self, message, interval, estimate, error):
        diagnostics = {"interval": interval, "estimate": estimate, "error": error}
        super(QuadratureError, self).__init__(message, diagnostics)
        self.interval = interval
        self.estimate = estimate
        self.error = error


class ExtrapolationError(ConvergenceError):
    def __init__(self, message, nodes, values):
        diagnostics = {"nodes": nodes, "values": values}
        super(ExtrapolationError, self).__init__(message, diagnostics)
        self.nodes = nodes
        self.values = values


class ReductionError(ConvergenceError):
    def __init__(self, message, point, iterations):
        diagnostics = {"point": point, "iterations": iterations}
        super(ReductionError, self).__init__(message, diagnostics)
        self.point = point
        self.iterations = iterations


class InverseCDFError(ConvergenceError):
    def __init__(self, message, t, quantiles):
        diagnostics = {"t": t, "quantiles": quantiles}
        super(InverseCDFError, self).__init__(message, diagnostics)
        self.t = t
        self.quantiles = quantiles

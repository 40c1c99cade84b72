# Copyright (c) 2024, The rankerg developers. All rights reserved.
# See LICENSE.txt for complete terms.

"""
Rank-one group data and the parametrisation of the spherical dual.

A rank-one group is described by the multiplicities ``(n1, n2)`` of its
restricted roots. Everything the rest of the package needs (the half-sum
``rho``, the Jacobi parameters ``alpha`` and ``beta``, the radial Haar
density) is derived from them. Spherical representations are labelled by a
SpectralParam: the trivial representation, a complementary series parameter
``s`` in ``(0, rho']`` or a principal series parameter ``i*lambda``.
"""

# stdlib
import fractions
import logging

# internal
from rankerg import errors

# Module-level logger
LOG = logging.getLogger(__name__)

# Group families accepted by make_group().
SO = "so"
SU = "su"
SP = "sp"
F4 = "f4"
CUSTOM = "custom"

FAMILIES = (SO, SU, SP, F4, CUSTOM)

# Relative slack used when comparing spectral parameters against rho and r.
_SLACK = 1e-12


class RankOneGroup(object):
    """Root data of a connected simple rank-one Lie group.

    Attributes:
        n1 (int): Multiplicity of the short restricted root.
        n2 (int): Multiplicity of the long restricted root.
        rho_prime (float): Upper end of the complementary series range.
        name (str): Display name, e.g. ``"SO(3,1)"``.
        rho_prime_assumed (bool): True when `rho_prime` was defaulted to
            ``rho`` for a group where that value is not known.
    """

    def __init__(self, n1, n2, rho_prime=None, name=None, rho_prime_assumed=False):
        if int(n1) != n1 or int(n2) != n2:
            msg = "Root multiplicities must be integers. Found ({0}, {1})"
            raise errors.InvalidGroupError(msg.format(n1, n2), spec=(n1, n2))

        if n1 < 1 or n2 < 0:
            msg = "A rank-one group needs n1 >= 1 and n2 >= 0. Found ({0}, {1})"
            raise errors.InvalidGroupError(msg.format(n1, n2), spec=(n1, n2))

        self._n1 = int(n1)
        self._n2 = int(n2)
        self._rho = fractions.Fraction(self._n1 + 2 * self._n2, 2)

        if rho_prime is None:
            rho_prime = float(self._rho)
        elif not (0 < rho_prime <= float(self._rho) * (1 + _SLACK)):
            msg = "rho_prime must satisfy 0 < rho_prime <= rho = {0}. Found {1}"
            raise errors.InvalidGroupError(msg.format(float(self._rho), rho_prime),
                                           spec=(n1, n2))

        self._rho_prime = min(float(rho_prime), float(self._rho))
        self._name = name or "custom({0},{1})".format(self._n1, self._n2)
        self._rho_prime_assumed = bool(rho_prime_assumed)

    @property
    def n1(self):
        return self._n1

    @property
    def n2(self):
        return self._n2

    @property
    def name(self):
        return self._name

    @property
    def rho_prime(self):
        return self._rho_prime

    @property
    def rho_prime_assumed(self):
        return self._rho_prime_assumed

    @property
    def rho_exact(self):
        """rho = (n1 + 2*n2)/2 as a Fraction."""
        return self._rho

    @property
    def alpha_exact(self):
        """alpha = (n1 + n2 - 1)/2 as a Fraction."""
        return fractions.Fraction(self._n1 + self._n2 - 1, 2)

    @property
    def beta_exact(self):
        """beta = (n2 - 1)/2 as a Fraction."""
        return fractions.Fraction(self._n2 - 1, 2)

    @property
    def rho(self):
        return float(self._rho)

    @property
    def alpha(self):
        return float(self.alpha_exact)

    @property
    def beta(self):
        return float(self.beta_exact)

    def with_rho_prime(self, rho_prime):
        """Return a copy of this group with a user supplied rho_prime."""
        return RankOneGroup(self._n1, self._n2, rho_prime=rho_prime, name=self._name)

    def _key(self):
        return (self._n1, self._n2, self._rho_prime)

    def __eq__(self, other):
        if other is self:
            return True

        try:
            return self._key() == other._key()
        except AttributeError:
            return False

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return "RankOneGroup({0}, n1={1}, n2={2}, rho={3}, rho_prime={4})".format(
            self._name, self._n1, self._n2, self.rho, self._rho_prime
        )


class SpectralParam(object):
    """A point of the spherical dual ``{rho} U (0, rho'] U iR+``.

    Use the trivial(), complementary() and principal() constructors.

    Attributes:
        kind (str): One of TRIVIAL, COMPLEMENTARY or PRINCIPAL.
        value (float): ``s`` for complementary, ``lambda`` for principal and
            0 for the trivial representation.
    """
    TRIVIAL = "trivial"
    COMPLEMENTARY = "complementary"
    PRINCIPAL = "principal"

    def __init__(self, kind, value=0.0):
        if kind not in (self.TRIVIAL, self.COMPLEMENTARY, self.PRINCIPAL):
            msg = "Unknown spectral parameter kind '{0}'".format(kind)
            raise errors.InvalidParameterError(msg, param=kind)

        value = float(value)

        if kind == self.COMPLEMENTARY and not value > 0:
            msg = "Complementary series parameter must be positive. Found {0}"
            raise errors.InvalidParameterError(msg.format(value), param=value)

        if kind == self.PRINCIPAL and not value >= 0:
            msg = "Principal series parameter must be nonnegative. Found {0}"
            raise errors.InvalidParameterError(msg.format(value), param=value)

        if kind == self.TRIVIAL:
            value = 0.0

        self._kind = kind
        self._value = value

    @classmethod
    def trivial(cls):
        return cls(cls.TRIVIAL)

    @classmethod
    def complementary(cls, s):
        return cls(cls.COMPLEMENTARY, s)

    @classmethod
    def principal(cls, lam):
        return cls(cls.PRINCIPAL, lam)

    @property
    def kind(self):
        return self._kind

    @property
    def value(self):
        return self._value

    @property
    def is_trivial(self):
        return self._kind == self.TRIVIAL

    @property
    def is_complementary(self):
        return self._kind == self.COMPLEMENTARY

    @property
    def is_principal(self):
        return self._kind == self.PRINCIPAL

    def re_s(self, group):
        """Real part of the spectral parameter: rho, s or 0."""
        if self.is_trivial:
            return group.rho
        elif self.is_complementary:
            return self._value
        return 0.0

    def s(self, group):
        """The parameter as a complex number: rho, s or i*lambda."""
        if self.is_trivial:
            return complex(group.rho, 0.0)
        elif self.is_complementary:
            return complex(self._value, 0.0)
        return complex(0.0, self._value)

    @property
    def label(self):
        """Spec string understood by parse_param()."""
        if self.is_trivial:
            return "trivial"
        elif self.is_complementary:
            return "c:{0!r}".format(self._value)
        return "p:{0!r}".format(self._value)

    def __eq__(self, other):
        if other is self:
            return True

        try:
            return (self._kind, self._value) == (other._kind, other._value)
        except AttributeError:
            return False

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash((self._kind, self._value))

    def __repr__(self):
        return "SpectralParam({0})".format(self.label)


class PurityReport(object):
    """Outcome of validate_purity(). Truthy when the spectrum is valid."""

    def __init__(self, violations):
        self.violations = tuple(violations)

    @property
    def valid(self):
        return not self.violations

    def __bool__(self):
        return self.valid

    __nonzero__ = __bool__

    def __repr__(self):
        return "PurityReport(valid={0}, violations={1})".format(self.valid, list(self.violations))


def check_param(group, param):
    """Raise InvalidParameterError if `param` is not in the spherical dual of
    `group` (complementary parameters must not exceed rho_prime)."""
    if param.is_complementary and param.value > group.rho_prime * (1 + _SLACK):
        msg = "Complementary parameter {0} exceeds rho_prime = {1} for {2}"
        msg = msg.format(param.value, group.rho_prime, group.name)
        raise errors.InvalidParameterError(msg, param=param)


def purity_violations(group, atoms, r, params):
    """Return the list of purity violations for the given data.

    Args:
        group: A RankOneGroup.
        atoms: Sequence of reals s_0 > s_1 > ... > s_k.
        r: The spectral gap parameter.
        params: Iterable of SpectralParam objects making up Omega.

    Returns:
        A list of human readable violation messages. Empty when valid.
    """
    violations = []
    rho = group.rho
    atoms = [float(a) for a in atoms]

    if not r > 0:
        violations.append("r = {0} must be positive".format(r))

    if not atoms:
        violations.append("atom list is empty; s_0 = rho is required")
    elif abs(atoms[0] - rho) > _SLACK * max(1.0, rho):
        violations.append("s_0 = {0} must equal rho = {1}".format(atoms[0], rho))

    for prev, cur in zip(atoms, atoms[1:]):
        if not cur < prev:
            violations.append("atoms must strictly decrease: {0} >= {1}".format(cur, prev))

    for idx, atom in enumerate(atoms):
        if not atom > r:
            violations.append("atom s_{0} = {1} must exceed r = {2}".format(idx, atom, r))
        if idx > 0 and atom > group.rho_prime * (1 + _SLACK):
            msg = "atom s_{0} = {1} exceeds rho_prime = {2}"
            violations.append(msg.format(idx, atom, group.rho_prime))

    for param in params:
        if param.is_trivial:
            violations.append("Omega must not contain the trivial representation")
        elif param.re_s(group) > r * (1 + _SLACK):
            msg = "Omega point {0} has Re(s) = {1} > r = {2}"
            violations.append(msg.format(param.label, param.re_s(group), r))

    return violations


def validate_purity(group, spectrum):
    """Check the purity inequalities ``rho = s_0 > s_1 > ... > s_k > r > 0``
    and ``Re(s) <= r`` on Omega.

    Args:
        group: A RankOneGroup.
        spectrum: An object with ``atoms``, ``r`` and ``omega`` attributes,
            where ``omega`` is a sequence of (SpectralParam, weight) pairs.
            A PuritySpectrum qualifies.

    Returns:
        A PurityReport listing each violated inequality separately.
    """
    params = [param for param, _ in spectrum.omega]
    violations = purity_violations(group, spectrum.atoms, spectrum.r, params)

    for msg in violations:
        LOG.debug("Purity violation: %s", msg)

    return PurityReport(violations)


def make_group(family, n=None, n1=None, n2=None, rho_prime=None):
    """Return the RankOneGroup for a named family.

    Args:
        family: One of "so", "su", "sp", "f4" or "custom".
        n: The rank parameter for SO(n,1), SU(n,1) and Sp(n,1).
        n1: Short root multiplicity for "custom".
        n2: Long root multiplicity for "custom".
        rho_prime: Optional upper end of the complementary range.

    Raises:
        errors.InvalidGroupError: If the family is unknown or `n` is out of
            range.
    """
    family = str(family).lower()

    if family == SO:
        _check_rank(family, n, 2)
        return RankOneGroup(n - 1, 0, rho_prime=rho_prime, name="SO({0},1)".format(n))

    if family == SU:
        _check_rank(family, n, 2)
        return _assumed(2 * (n - 1), 1, rho_prime, "SU({0},1)".format(n))

    if family == SP:
        _check_rank(family, n, 2)
        return _assumed(4 * (n - 1), 3, rho_prime, "Sp({0},1)".format(n))

    if family == F4:
        return _assumed(8, 7, rho_prime, "F4(-20)")

    if family == CUSTOM:
        if n1 is None or n2 is None:
            msg = "custom groups need both n1 and n2"
            raise errors.InvalidGroupError(msg, spec=family)
        return RankOneGroup(n1, n2, rho_prime=rho_prime)

    msg = "Unknown group family '{0}'. Expected one of {1}".format(family, FAMILIES)
    raise errors.InvalidGroupError(msg, spec=family)


def _check_rank(family, n, minimum):
    if n is None or int(n) != n or n < minimum:
        msg = "{0}(n,1) needs an integer n >= {1}. Found {2}".format(family.upper(), minimum, n)
        raise errors.InvalidGroupError(msg, spec=(family, n))


def _assumed(n1, n2, rho_prime, name):
    group = RankOneGroup(n1, n2, rho_prime=rho_prime, name=name,
                         rho_prime_assumed=rho_prime is None)

    if group.rho_prime_assumed:
        LOG.warning("rho_prime for %s is not known; defaulting to rho = %s",
                    name, group.rho)

    return group


def parse_group(spec, rho_prime=None):
    """Parse a group spec ``so:n | su:n | sp:n | f4 | custom:n1,n2``.

    Raises:
        errors.InvalidGroupError: If the spec cannot be parsed.
    """
    text = str(spec).strip().lower()
    family, _, arg = text.partition(":")

    try:
        if family == F4 and not arg:
            return make_group(F4, rho_prime=rho_prime)
        elif family == CUSTOM:
            n1, n2 = (int(x) for x in arg.split(","))
            return make_group(CUSTOM, n1=n1, n2=n2, rho_prime=rho_prime)
        elif family in (SO, SU, SP):
            return make_group(family, n=int(arg), rho_prime=rho_prime)
    except ValueError:
        pass

    msg = "Cannot parse group spec '{0}'. Expected so:n | su:n | sp:n | f4 | custom:n1,n2"
    raise errors.InvalidGroupError(msg.format(spec), spec=spec)


def parse_param(spec):
    """Parse a spectral parameter spec ``trivial | c:<s> | p:<lambda>``.

    Raises:
        errors.InvalidParameterError: If the spec cannot be parsed.
    """
    text = str(spec).strip().lower()

    if text == "trivial":
        return SpectralParam.trivial()

    kind, _, arg = text.partition(":")

    try:
        if kind == "c":
            return SpectralParam.complementary(float(arg))
        elif kind == "p":
            return SpectralParam.principal(float(arg))
    except ValueError:
        pass

    msg = "Cannot parse spectral parameter '{0}'. Expected trivial | c:<s> | p:<lambda>"
    raise errors.InvalidParameterError(msg.format(spec), param=spec)

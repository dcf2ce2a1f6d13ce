# This file is part of mlexp
# See file LICENSE.txt for license information.


class MLExpError(Exception):
    pass


class DomainError(MLExpError, ValueError):
    """An argument lies outside the domain of the requested operation."""


class PoleError(DomainError):
    """Gamma evaluated at a non-positive integer."""


class UsageError(MLExpError):
    """Bad command line. The message names the offending flag."""

    exit_code = 2

"""Exceptions for apn-forge."""


class ApnForgeError(Exception):
    """Base exception for all apn-forge errors.

    All apn-forge exceptions should inherit from this base class
    to allow users to catch all apn-forge related errors.
    """


class ApnForgeDomainError(ApnForgeError):
    """Base exception for domain layer errors.

    Domain errors represent violated mathematical preconditions,
    such as a reducible modulus or division by zero in the field.
    """


class ApnForgeInfrastructureError(ApnForgeError):
    """Base exception for infrastructure layer errors.

    Infrastructure errors relate to external systems,
    such as file I/O failures or malformed configuration files.
    """


class PreconditionError(ApnForgeDomainError, ValueError):
    """Raised when an operation is called outside its documented domain."""

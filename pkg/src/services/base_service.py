"""
Base service class providing common functionality for all toolkit services.

This module provides a standard foundation for all service classes with:
- The shared exception hierarchy
- Standard logging setup
- Access to the resource caps from the settings layer
"""

import logging
from abc import ABC
from typing import Optional

from src.config.settings import ComputeSettings, get_settings


class BaseServiceError(Exception):
    """Base exception for all toolkit operations."""
    pass


class ServiceValidationError(BaseServiceError):
    """Raised when an input fails validation."""
    pass


class ServiceNotFoundError(BaseServiceError):
    """Raised when a requested entry is not found."""
    pass


class ServiceResourceError(BaseServiceError):
    """Raised when a computation exceeds a configured resource cap."""
    pass


class BaseService(ABC):
    """
    Abstract base class for the toolkit services.

    Provides common functionality:
    - Resource caps taken from ComputeSettings
    - Standardized logging
    """

    def __init__(self, compute: Optional[ComputeSettings] = None):
        """
        Initialize base service.

        Args:
            compute: Optional compute settings; defaults to the global settings.
        """
        self.compute = compute if compute is not None else get_settings().compute
        self.logger = logging.getLogger(self.__class__.__name__)


__all__ = [
    "BaseServiceError",
    "ServiceValidationError",
    "ServiceNotFoundError",
    "ServiceResourceError",
    "BaseService",
]

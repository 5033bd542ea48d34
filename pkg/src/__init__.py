"""delpezzo-kit

Verification toolkit for RDP del Pezzo surfaces in small characteristic.
"""

__version__ = "0.1.0"

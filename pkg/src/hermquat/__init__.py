"""Binary Hermitian forms, quaternion ideals and partial zeta functions over imaginary quadratic fields."""

__version__ = "0.1.0"

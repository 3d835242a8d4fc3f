"""ffzeta - zeta functions of function fields over finite fields."""
__version__ = "1.0.0"

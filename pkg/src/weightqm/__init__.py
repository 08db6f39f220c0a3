"""Weight quasimorphisms of group actions on graphs and explicit certificates
for the vanishing of cup and Massey products with their classes."""

__version__ = "0.1.0"

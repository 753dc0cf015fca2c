"""Support tau-tilting theory through the morphism category of projectives.

Modules: ``exactlin`` (linear algebra over F_p), ``algebra`` (bound quiver
algebras), ``repmod`` (representations), ``taucore`` (tau-rigid pairs),
``morcat`` (maps between projectives), ``icecat`` (ICE-closed
subcategories) and ``workbench`` (command line).
"""

__version__ = "0.1.0"

"""weilmod: exact l-modular Weil representations, metaplectic cocycles and
finite theta lifts over F_q and Q_p."""

__version__ = "0.1.0"

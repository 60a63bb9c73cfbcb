"""Metaplectic cocycles and extended covering groups over Q_p."""

"""Exact tools for filling problems in right-angled Artin groups, labelled
oriented graph groups and their Bestvina-Brady style level sets."""

__version__ = "0.1.0"

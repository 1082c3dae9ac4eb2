"""Daily mood classification from smartphone pupil-iris-ratio streams."""

__version__ = "0.1.0"

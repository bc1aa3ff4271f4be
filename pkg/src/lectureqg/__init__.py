"""Question generation toolkit for timed lecture transcripts."""

__version__ = "0.1.0"

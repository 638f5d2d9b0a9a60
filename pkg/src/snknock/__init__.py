"""SNKnock: voice challenge-response friend verification, plus a simulator
of staged profile-cloning attacks for measuring what the defense buys."""

__version__ = "0.1.0"

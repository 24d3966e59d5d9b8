"""Constants, configuration loading and random streams."""

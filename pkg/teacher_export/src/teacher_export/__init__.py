"""Teacher-vector exporter: thin batch encoder writing the workbench's
JSON Lines embedding format."""

__version__ = "0.1.0"

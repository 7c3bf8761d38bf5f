"""Command-line interface and its report rendering."""

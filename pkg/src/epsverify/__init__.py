"""p-adic verification toolkit."""

"""Tests for rankgap."""

#!/usr/bin/env python3
"""
pellforms - Main Entry Point
"""
from pellforms.cli import app


if __name__ == "__main__":
    app()

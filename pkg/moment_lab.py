#!/usr/bin/env python3
"""
Moment Lab - Launcher

Usage:
    python moment_lab.py reproduce
    python moment_lab.py analyze --builtin 1
    python moment_lab.py povm dilate povm.json
"""

import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(os.path.abspath(__file__)), 'src'))

from main import main

if __name__ == '__main__':
    sys.exit(main())

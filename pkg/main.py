# -*- coding: utf-8 -*-
"""
squeeze-bypass - Entry point
Routes to the controller CLI: python main.py {train,calibrate,attack,evaluate,squeeze} ...
"""
import sys

from controller.cli import main

if __name__ == "__main__":
    sys.exit(main())

# -*- coding: utf-8 -*-
# Utils - Helper functions and utilities
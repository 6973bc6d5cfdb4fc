# -*- coding: utf-8 -*-
# Core numerical modules - pure numpy, no CLI or file-system side effects outside the readers/writers

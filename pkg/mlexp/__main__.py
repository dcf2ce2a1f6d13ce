# This file is part of mlexp
# See file LICENSE.txt for license information.

from .cli import cli

cli()

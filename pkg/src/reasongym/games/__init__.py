"""Game engines.  Importing this package registers every engine.

Registration order follows the dimension grouping MLR, PR, SGR, SR, CIR.
"""

# isort: off
from . import sudoku, lights, hanoi, euler  # noqa: F401
from . import wordle  # noqa: F401
from . import maze, sokoban, puzzle8  # noqa: F401
from . import g2048, trust, npoint  # noqa: F401
from . import snake, minesweeper, bwcopy  # noqa: F401

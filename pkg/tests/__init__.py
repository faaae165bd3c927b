import stacount
import os

STACOUNT_ROOT = os.path.realpath(
    os.path.join(
        os.path.realpath(stacount.__file__),
        '..'
    )
)
TESTS_ROOT = os.path.realpath(os.path.join(STACOUNT_ROOT, '../tests'))

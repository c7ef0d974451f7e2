import os
import sys

from dipolar_eit import create_app
from dipolar_eit.cli import run

app = create_app(os.getenv('DIPOLAR_EIT_ENV', 'development'))

if __name__ == '__main__':
    sys.exit(run(app=app))

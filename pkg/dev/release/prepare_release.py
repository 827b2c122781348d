'''
Tag a release and build the distribution files. Run from dev/release.
'''
import os
import shutil
import subprocess
import sys

import rerankd


def git(*args):
    return subprocess.call(('git', ) + args)


if __name__ == '__main__':
    # require a clean working directory
    if git('diff-index', '--quiet', 'HEAD', '--') != 0:
        print('You have uncommited changes, commit them first')
        sys.exit(1)

    print('Current version is: %s' % rerankd.__version__)
    version = input('Enter new rerankd version number: ').strip()
    if not version:
        sys.exit('No version given')

    # setuptools_scm takes the version from the tag
    git('tag', '-a', '-m', 'Release rerankd %s' % version, version)

    os.chdir(os.path.join('..', '..'))
    if os.path.exists('dist'):
        shutil.rmtree('dist')
    subprocess.check_call([sys.executable, 'setup.py', 'sdist',
                           '--formats=gztar', 'bdist_wheel'])

    print('')
    print('*' * 60)
    print('To push, use the following command:')
    print('git push --tags origin master')
    print('To upload to pypi:')
    print('twine upload dist/*')

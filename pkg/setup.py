"""
Workspace bootstrap for pellforms: .env, output directories, .gitignore
"""
import os

from pellforms.config import default_families_path, default_gig_fixture


def check_data_files():
    """Both bundled data files must be present before any pell command runs"""
    ok = True
    for label, path in (("family tables", default_families_path()), ("gig fixture", default_gig_fixture())):
        if os.path.exists(path):
            print(f"✅ {label}: {path}")
        else:
            print(f"❌ {label} missing: {path}")
            ok = False
    return ok


def setup_environment():
    """Set up the working directories and configuration"""

    print("🔧 Setting up pellforms workspace...")
    print("-" * 50)

    if not os.path.exists('.env'):
        print("⚠️  No .env file found. Creating from .env.example...")
        if os.path.exists('.env.example'):
            with open('.env.example', 'r') as src, open('.env', 'w') as dst:
                dst.write(src.read())
            print("✅ .env file created.")
        else:
            print("❌ .env.example not found!")
    else:
        print("✅ .env file exists")

    for directory in ['data', 'reports', 'logs']:
        os.makedirs(directory, exist_ok=True)
        print(f"✅ Created directory: {directory}/")

    check_data_files()

    gitignore_content = """
# Environment variables
.env

# Python
__pycache__/
*.py[cod]
.pytest_cache/
.hypothesis/
venv/

# Reports and logs
reports/grid_*
logs/*.log

# IDE
.vscode/
.idea/
"""

    with open('.gitignore', 'w') as f:
        f.write(gitignore_content.strip() + "\n")
    print("✅ Created .gitignore file")

    print("\n📋 Setup Complete!")
    print("-" * 50)
    print("Next steps:")
    print("1. pip install -r requirements.txt")
    print("2. python main.py approx-root 448 672 560 280 84 14 1 --trace")
    print("3. python main.py pell grid --degree 3 --degree 5")
    print("4. pytest")


if __name__ == "__main__":
    setup_environment()

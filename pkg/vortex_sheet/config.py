from vortex_sheet.config_loader import ConfigLoader


config = ConfigLoader()
